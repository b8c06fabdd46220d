import json
import os
from typing import Any, Dict
from MeshFlow.typing import privatemethod

class JSON:
    """
    Class to manage JSON documents easily.

    Used for network checkpoints and metric records. Floats are written with
    Python's shortest round-trip representation, so arrays stored through this
    class reload bit-identically.
    """

    def __init__(self, filepath: str):
        self.filepath = os.fspath(filepath)
        self.data = None

    @privatemethod
    def resolve(self, data: Any, keys: list) -> tuple[Any, str]:
        """
        Walk data following keys and return (parent, lastKey).

        Args:
            data: Root object to traverse.
            keys: List of key segments already split by '.'.

        Returns:
            (parentNode, finalKey) so the caller can do parent[key].

        Raises:
            KeyError:  A segment does not exist.
            TypeError: A segment exists but its value is not a dict.
        """
        node = data
        for key in keys[:-1]:
            if not isinstance(node, dict):
                raise TypeError(f"Expected a dict at '{key}', got {type(node).__name__}.")
            if key not in node:
                raise KeyError(f"Key '{key}' not found.")
            node = node[key]
        return node, keys[-1]

    def read(self) -> Dict[str, Any]:
        try:
            with open(self.filepath, 'r', encoding='utf-8') as f:
                self.data = json.load(f)
            return self.data
        except FileNotFoundError:
            raise FileNotFoundError(f"The file '{self.filepath}' does not exist.")
        except json.JSONDecodeError as e:
            raise json.JSONDecodeError(f"Error decoding JSON: '{e.msg}'", e.doc, e.pos)

    def write(self, data: Dict[str, Any], indent: int | None = None) -> None:
        try:
            with open(self.filepath, 'w', encoding='utf-8') as f:
                json.dump(data, f, indent=indent, ensure_ascii=False, allow_nan=False)
        except PermissionError:
            raise PermissionError(f"You do not have permissions to write to '{self.filepath}'.")
        self.data = data

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get a value using dot-notation key.
        """
        if self.data is None:
            self.read()
        try:
            parent, lastKey = self.resolve(self.data, key.split('.'))
            return parent.get(lastKey, default) if isinstance(parent, dict) else default
        except (KeyError, TypeError):
            return default

    @staticmethod
    def line(data: Dict[str, Any]) -> str:
        """
        Serialize a flat record on a single line, keeping the key order.
        """
        return json.dumps(data, ensure_ascii=False, allow_nan=True, separators=(', ', ': '))
