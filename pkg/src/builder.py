"""CampaignBuilder: wires the comparison schemes named in a CampaignConfig."""
from src.config import CampaignConfig
from src.schemes.base import BaseScheme
from src.schemes.bounds import AverageBoundScheme, DeterministicBoundScheme
from src.schemes.fpa import FpaScheme
from src.schemes.grid import GridExhaustiveScheme
from src.schemes.otpa import OtpaScheme
from src.schemes.proposed import ProposedScheme
from src.schemes.selection import AntennaSelectionScheme

SCHEMES: dict[str, type[BaseScheme]] = {
    cls.name: cls
    for cls in (
        ProposedScheme,
        FpaScheme,
        AntennaSelectionScheme,
        OtpaScheme,
        GridExhaustiveScheme,
        DeterministicBoundScheme,
        AverageBoundScheme,
    )
}


class CampaignBuilder:
    """Builds the ordered scheme list for a campaign from config."""

    def __init__(self, config: CampaignConfig):
        self.config = config

    def build(self) -> list[BaseScheme]:
        """Instantiate the configured schemes, in config order."""
        return [self._build_scheme(name) for name in self.config.schemes]

    def build_checks(self) -> dict[str, BaseScheme]:
        """Schemes the invariant checks need, whether or not the config asked for them."""
        return {name: self._build_scheme(name) for name in ("fpa", "bound_deterministic")}

    def _build_scheme(self, name: str) -> BaseScheme:
        if name not in SCHEMES:
            raise ValueError(f"Unknown scheme: {name}")
        return SCHEMES[name]()
