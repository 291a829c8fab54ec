STD_DIM_NAMES = {
    "k": "k",
    "k1": "k1",
    "k2": "k2",
    "fixed_point": "fixed_point",
    "sv_index": "sv_index",
}

FIXED_POINT_LABELS = {
    "circle": ["0", "pi"],
    "torus": ["(0,0)", "(pi,0)", "(0,pi)", "(pi,pi)"],
}

MODEL_CONFIG = {
    "q_plus": {
        "space": "circle",
        "rank": 2,
        "builder": "q_const",
        "builder_args": {"space": "circle"},
        "variable_rank": True,
        "expected": "nu=+1",
        "description": "Constant standard symplectic matrix Q.",
    },
    "q_minus": {
        "space": "circle",
        "rank": 2,
        "builder": "q_minus",
        "builder_args": {},
        "variable_rank": True,
        "expected": "nu=-1",
        "description": "Corner block [[0, e^ik], [-e^-ik, 0]] plus Q of size 2n - 2.",
    },
    "q1_rot": {
        "space": "circle",
        "rank": 2,
        "builder": "q_rot",
        "builder_args": {},
        "variable_rank": False,
        "expected": "nu=-1",
        "description": "Rotated sewing matrix [[sin k, -cos k], [cos k, sin k]].",
    },
    "q_0": {
        "space": "torus",
        "rank": 2,
        "builder": "q_const",
        "builder_args": {"space": "torus"},
        "variable_rank": True,
        "expected": "triple=(+1,+1,+1)",
        "description": "Constant Q on the torus.",
    },
    "q_w1": {
        "space": "torus",
        "rank": 2,
        "builder": "q_weak",
        "builder_args": {"axis": 1},
        "variable_rank": True,
        "expected": "triple=(-1,+1,+1)",
        "description": "q_minus pulled back along the first coordinate.",
    },
    "q_w2": {
        "space": "torus",
        "rank": 2,
        "builder": "q_weak",
        "builder_args": {"axis": 2},
        "variable_rank": True,
        "expected": "triple=(+1,-1,+1)",
        "description": "q_minus pulled back along the second coordinate.",
    },
    "q_s": {
        "space": "torus",
        "rank": 2,
        "builder": "q_strong_2d",
        "builder_args": {},
        "variable_rank": False,
        "expected": "triple=(+1,+1,-1)",
        "description": "Sphere sewing matrix pulled back by the torus-to-sphere map.",
    },
}

SERIES_CONFIG = {
    "det_phase": {
        "variable_name": "det_phase",
        "dims": {"circle": ["k"], "torus": ["k1", "k2"]},
        "unit": "rad",
        "description": "Unwrapped phase of det q.",
        "save_filename": "Det_phase",
    },
    "pfaffian_real": {
        "variable_name": "pfaffian_real",
        "dims": {"circle": ["fixed_point"], "torus": ["fixed_point"]},
        "unit": "",
        "description": "Real part of Pf q at the fixed points.",
        "save_filename": "Pfaffian",
    },
    "pfaffian_imag": {
        "variable_name": "pfaffian_imag",
        "dims": {"circle": ["fixed_point"], "torus": ["fixed_point"]},
        "unit": "",
        "description": "Imaginary part of Pf q at the fixed points.",
        "save_filename": "Pfaffian",
    },
    "singular_values": {
        "variable_name": "singular_values",
        "dims": {"circle": ["sv_index"]},
        "unit": "",
        "description": "Singular values of the Toeplitz kernel elimination map.",
        "save_filename": "Singular_values",
    },
}
