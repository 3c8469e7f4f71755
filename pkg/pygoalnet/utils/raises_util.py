import pytest

def raises(exception, code, match=None):
    """
    Utility for testing exceptions.

    Parameters
    ==========

    exception
        A valid python exception
    code: lambda
        Code that causes exception
    match: str
        Optional, a regular expression which
        the error message must contain.
    """
    with pytest.raises(exception, match=match):
        code()
    return True
