from abc import ABC, abstractmethod

import numpy as np


class PlacementObjective(ABC):
    """Objective over an N×2 array of antenna positions, ascended one antenna at a time.

    Subclasses must set `name` as a class variable and implement the three methods.
    ``antenna_value`` must equal ``total`` of the positions with row ``index``
    replaced by ``position``, computed the same way, so that accepted steps keep
    the AO trace non-decreasing exactly.
    """

    name: str

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if not getattr(cls, "name", None) and "Abstract" not in cls.__name__:
            raise TypeError(f"{cls.__name__} must define a 'name' class variable")

    @abstractmethod
    def total(self, positions: np.ndarray) -> float:
        ...

    @abstractmethod
    def antenna_value(self, index: int, position: np.ndarray, positions: np.ndarray) -> float:
        ...

    @abstractmethod
    def antenna_gradient(self, index: int, position: np.ndarray, positions: np.ndarray) -> np.ndarray:
        """Gradient with respect to antenna ``index``'s (x, y) with the others held fixed."""
        ...

    def antenna_values(self, index: int, candidates: np.ndarray, positions: np.ndarray) -> np.ndarray:
        """``antenna_value`` at every row of ``candidates``; used only to rank restart points."""
        return np.array([self.antenna_value(index, c, positions) for c in candidates])
