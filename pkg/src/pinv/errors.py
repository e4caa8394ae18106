class InvariantViolation(ArithmeticError):
    """An exactness or integrality invariant failed during a computation."""


class InvalidInput(ValueError):
    """A request document failed validation.

    ``location`` is a JSON-pointer style path into the document.
    """

    def __init__(self, location: str, message: str):
        super().__init__(f"{location or '/'}: {message}")
        self.location = location or "/"
        self.message = message
