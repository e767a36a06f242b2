import pandas as pd


def get_timestamp() -> str:
    """Current UTC time, e.g. '2024-05-01T12:00:00+00:00'."""
    return pd.Timestamp.now(tz="UTC").isoformat(timespec="seconds")
