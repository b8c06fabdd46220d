import os
import fnmatch
from typing import List, Optional

class Folder:
    """
    Class to manage folders easily.
    Used to enumerate template libraries and to prepare output folders.
    """

    def __init__(self, folderpath: str | os.PathLike):
        """
        Initialize the folder manager.

        Args:
            folderpath: Path to the folder
        """
        self.folderpath = os.fspath(folderpath)

    def create(self, existOk: bool = True) -> None:
        """
        Create the folder and any missing parents.

        Args:
            existOk: If True, don't raise error if folder already exists

        Raises:
            FileExistsError: If folder exists and existOk is False
        """
        try:
            os.makedirs(self.folderpath, exist_ok=existOk)
        except FileExistsError:
            raise FileExistsError(f"Folder '{self.folderpath}' already exists")

    def exists(self) -> bool:
        """
        Check if the folder exists.
        """
        return os.path.isdir(self.folderpath)

    def listFiles(self, pattern: Optional[str] = None) -> List[str]:
        """
        List the files directly inside the folder, sorted by name.

        Args:
            pattern: Optional pattern to filter files (e.g., "*.obj"), matched
                case-insensitively.

        Returns:
            List of full file paths.

        Raises:
            FileNotFoundError: If the folder doesn't exist.
        """
        if not self.exists():
            raise FileNotFoundError(f"Folder '{self.folderpath}' does not exist")

        names = sorted(os.listdir(self.folderpath))
        files = []
        for name in names:
            fullPath = os.path.join(self.folderpath, name)
            if not os.path.isfile(fullPath):
                continue
            if pattern is None or fnmatch.fnmatch(name.lower(), pattern.lower()):
                files.append(fullPath)
        return files
