"""
BaseRepository is an abstract class for file-backed stores
"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Union

from utils.exceptions import ResultWriteError

PathLike = Union[str, Path]


class BaseRepository(ABC):
    """
    BaseRepository is an abstract class that defines the methods
    that must be implemented by the repositories.
    """

    def __init__(self, root: PathLike = "."):
        self._root = Path(root)

    @property
    def root(self) -> Path:
        """
        Directory relative paths are resolved against
        """
        return self._root

    def resolve(self, path: PathLike) -> Path:
        """
        Resolve a path against the repository root
        :param path: str | Path
        :return: Path
        """
        path = Path(path)
        return path if path.is_absolute() else self._root / path

    def ensure_parent(self, path: Path) -> Path:
        """
        Create the parent directory of path
        :param path: Path
        :return: Path
        """
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ResultWriteError(f"cannot create directory {path.parent}: {e}") from e
        return path

    @abstractmethod
    def save(self, item: Any, path: PathLike) -> Path:
        """
        Write an item
        :param item: value to write
        :param path: str | Path
        :return: Path written
        """

    @abstractmethod
    def load(self, path: PathLike) -> Any:
        """
        Read an item
        :param path: str | Path
        :return: value read
        """
