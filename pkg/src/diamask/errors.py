"""Error type shared across the package.

DataError marks problems with input data (bad records, impossible requests),
as opposed to programming errors, which stay plain ValueError/TypeError. The
CLI maps DataError to exit status 1 and usage problems to exit status 2.
"""


class DataError(Exception):
    """Invalid or inconsistent input data."""
