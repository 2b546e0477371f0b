"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Model, market or engine parameters violate their invariants."""


class StripError(ParameterError):
    """A characteristic function was evaluated outside its analyticity strip."""


class IntegrationError(ArithmeticError):
    """A quadrature produced a non-finite integrand value."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class UndefinedAtJump(ArithmeticError):
    """A closed-form Greek was requested exactly at the ME jump location S0*."""

    def __init__(self, greek, s0_star):
        super().__init__(f"{greek} is undefined at the jump location S0*={s0_star:.12g}")
        self.greek = greek
        self.s0_star = s0_star


class ScenarioPricingError(RuntimeError):
    """Repricing failed for a Monte Carlo scenario."""

    def __init__(self, index, s, cause=None):
        super().__init__(f"pricing failed for scenario {index} (S_t={s!r}): {cause}")
        self.index = index
        self.s = s
