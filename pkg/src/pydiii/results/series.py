import os

import pandas as pd
import xarray as xr

from .config import SERIES_CONFIG

SUPPORTED_FORMATS = ("netcdf", "csv")


def variable_arr_to_flat_df(var_arr: xr.DataArray) -> pd.DataFrame:
    """Convert a series to a flattened dataframe with the correct variable name."""
    var_name = var_arr.attrs["name"]
    return var_arr.to_dataframe(name=var_name).reset_index()


def _write_netcdf(dataset: xr.Dataset, save_dir: str, stem: str):
    dataset.to_netcdf(os.path.join(save_dir, stem + ".nc"))


def _write_dataframes(dataset: xr.Dataset, save_dir: str, stem: str):
    """Write one csv per save file group, merging series that share dimensions."""
    frames: dict[str, pd.DataFrame] = {}
    for var_name in dataset.data_vars:
        group = SERIES_CONFIG[var_name]["save_filename"]
        df = variable_arr_to_flat_df(dataset[var_name])
        if group in frames:
            dims = list(dataset[var_name].dims)
            frames[group] = pd.merge(frames[group], df, on=dims, how="outer")
        else:
            frames[group] = df

    for group, df in frames.items():
        df.to_csv(os.path.join(save_dir, f"{stem}_{group}.csv"), index=False)


def save_series(dataset: xr.Dataset, save_dir: str, stem: str, formats: list[str]):
    """Write the raw series of a report to all formats given.

    Only NetCDF4, "netcdf", and CSV, "csv", are supported.

    Args:
        dataset (xr.Dataset): Series from :meth:`InvariantReport.series`.
        save_dir (str): Existing output directory.
        stem (str): File name stem, usually the input file stem.
        formats (list[str]): Formats to save the series in.
    """
    unknown = set(formats) - set(SUPPORTED_FORMATS)
    if unknown:
        raise ValueError(f"Unsupported series formats: {sorted(unknown)}.")

    if "netcdf" in formats:
        _write_netcdf(dataset, save_dir, stem)
    if "csv" in formats:
        _write_dataframes(dataset, save_dir, stem)
