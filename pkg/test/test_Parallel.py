import pytest

from pydiii.config import THREADS_ENV_VAR, cap_workers, get_thread_count
from pydiii.exceptions import ParseError
from pydiii.results import ReportOptions
from pydiii.worker import run_invariants_parallel

from test.utils import write_field


@pytest.fixture
def batch(tmp_path, q_plus, q_minus_1, q_minus_sum):
    paths = [
        write_field(tmp_path, "q_plus", q_plus),
        write_field(tmp_path, "q_minus", q_minus_1),
        write_field(tmp_path, "q_minus_sum", q_minus_sum),
    ]
    broken = tmp_path / "broken.json"
    broken.write_text("[]")
    paths.insert(2, broken)
    return [str(p) for p in paths]


class TestThreadCount:
    def test_env_var(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV_VAR, "3")
        assert get_thread_count() == 3
        assert cap_workers(8) == 3
        assert cap_workers(2) == 2

    def test_unset_warns(self, monkeypatch):
        monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
        with pytest.warns(UserWarning):
            assert get_thread_count() >= 1

    @pytest.mark.parametrize("value", ["zero", "0"])
    def test_invalid(self, monkeypatch, value):
        monkeypatch.setenv(THREADS_ENV_VAR, value)
        with pytest.raises(ValueError):
            get_thread_count()


class TestRunParallel:
    def check_results(self, results, paths):
        assert [path for path, _, _ in results] == paths
        reports = [report for _, report, _ in results]
        nus = [None if rep is None else rep.invariants["nu_1d"] for rep in reports]
        assert nus == [1, -1, None, 1]
        _, report, err = results[2]
        assert report is None
        assert isinstance(err, ParseError)
        assert err.exit_code == 3

    def test_serial(self, batch):
        options = ReportOptions()
        results = run_invariants_parallel(batch, options, 1, show_progress=False)
        self.check_results(results, batch)

    def test_pool_matches_serial(self, batch, monkeypatch):
        monkeypatch.setenv(THREADS_ENV_VAR, "2")
        options = ReportOptions(toeplitz=True, bandwidth=2)
        pooled = run_invariants_parallel(batch, options, 4, show_progress=False)
        serial = run_invariants_parallel(batch, options, 1, show_progress=False)
        self.check_results(pooled, batch)

        for (_, a, _), (_, b, _) in zip(pooled, serial):
            if a is not None:
                assert a.to_json() == b.to_json()

    def test_worker_count_is_capped(self, batch, monkeypatch, mocker):
        monkeypatch.setenv(THREADS_ENV_VAR, "2")
        pool = mocker.patch("pydiii.worker.mp.Pool")
        pool.return_value.__enter__.return_value.imap.return_value = iter([])
        run_invariants_parallel(batch, ReportOptions(), 16, show_progress=False)
        assert pool.call_args.kwargs["processes"] == 2
