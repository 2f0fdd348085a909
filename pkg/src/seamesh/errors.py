"""Package-wide error type carrying a stable machine-readable code."""


class SeameshError(Exception):
    """Raised for contract violations; ``code`` is stable across releases."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code

    def __str__(self) -> str:
        return f"{self.code}: {self.args[0]}"
