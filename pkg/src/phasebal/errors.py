"""Exception types shared across the package."""


class BalancedStartError(ValueError):
    """Initial headings are already balanced, so the order-parameter phase
    is undefined and no subgroup partition exists."""


class AnalysisScopeError(ValueError):
    """The request falls outside the proven analytical scope (wrong agent
    count, inadmissible gains, or a precondition the closed-form results
    require). Simulation remains available for such scenarios."""


class DegenerateHeadingsError(AnalysisScopeError):
    """All shifted initial headings coincide; the reachable interval is
    empty and the scenario is already balanced-compatible."""


class TargetNotReachableError(AnalysisScopeError):
    """The requested steady direction cannot be produced by any admissible
    gain set."""


class SimulationDivergedError(RuntimeError):
    """A non-finite state was encountered during integration."""

    def __init__(self, step: int, t: float, last_good):
        self.step = step
        self.t = t
        self.last_good = last_good
        super().__init__(
            f"non-finite state at step {step} (t={t:g}); "
            f"last good sample at t={last_good.t:g}"
        )
