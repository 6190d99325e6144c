"""Error type shared by all phonosel modules."""


class DataError(ValueError):
    """Fatal problem with input data or file content.

    Raised for malformed files, violated preconditions and corrupt
    serialized artifacts. The CLI maps this to exit code 2.
    """
