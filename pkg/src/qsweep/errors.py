"""Exception types shared across the solver."""


class SolverError(Exception):
    """Base class for numerical failures inside the engine."""


class NumericalSingularityError(SolverError):
    """A step-recursion denominator collapsed below the denormal floor."""

    def __init__(self, energy: float, step: int):
        super().__init__(
            f"singular recursion denominator at step {step}, E={energy!r} eV"
        )
        self.energy = energy
        self.step = step


class InvalidEnergyError(SolverError):
    """Energy violates a scattering precondition (e.g. evanescent incidence)."""


class InvalidEigenvalueError(SolverError):
    """No classically allowed region exists at the requested energy."""


class InvalidDesignError(SolverError):
    """Wave-packet design parameters are unusable (e.g. momentum range crosses zero)."""


class ConfigError(Exception):
    """Run-configuration file is invalid; carries every problem found."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))
