class InfeasibleError(ValueError):
    """A requested transfer cannot be synthesized under the stated constraints.

    `condition` names the failed requirement (e.g. "cc1", "half-plane",
    "bang-bang").
    """

    def __init__(self, condition: str, message: str):
        super().__init__(f"{condition}: {message}")
        self.condition = condition
