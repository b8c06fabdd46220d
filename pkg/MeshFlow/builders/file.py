import os

class File:
    """
    A text file handler for the ASCII formats MeshFlow reads and writes.

    OBJ meshes, XYZ point sets, CSV loss traces, config files and pair
    manifests all go through this class, so every format shares the same
    encoding and the same error translation.

    Attributes:
        filepath (str): The path to the file to be managed.
        encoding (str): The encoding used for file operations. Defaults to 'utf-8'.
        newline (str): Line terminator written by `writeLines`. Defaults to '\\n'.
    """

    def __init__(self, filepath) -> None:
        """
        Initializes the file handler with a specific filepath.

        Args:
            filepath (str | os.PathLike): The path to the file to be managed.
        """
        self.filepath: str = os.fspath(filepath)
        self.encoding: str = 'utf-8'
        self.newline: str = '\n'

    def readFile(self, lines: bool = False) -> str | list[str]:
        """
        Reads the content of the file.

        Args:
            lines (bool, optional): If True, returns content as a list of lines
                without their terminators. Defaults to False.

        Returns:
            str | list[str]: The file content.

        Raises:
            FileNotFoundError: If the file does not exist.
            IsADirectoryError: If the path names a directory.
        """
        try:
            with open(file=self.filepath, mode='r', encoding=self.encoding) as file:
                return file.read() if not lines else file.read().splitlines()
        except FileNotFoundError:
            raise FileNotFoundError(f"File '{self.filepath}' does not exist.")
        except IsADirectoryError:
            raise IsADirectoryError(f"'{self.filepath}' is a directory, not a file.")

    def writeFile(self, data: str) -> bool:
        """
        Writes data to the file, replacing its content.

        Args:
            data (str): The content to write to the file.

        Returns:
            bool: True if the write operation was successful.

        Raises:
            PermissionError: If the path cannot be written.
            OSError: For any other I/O failure, e.g. a missing parent folder.
        """
        try:
            with open(file=self.filepath, mode='w', encoding=self.encoding, newline='') as file:
                file.write(data)

            return True
        except PermissionError:
            raise PermissionError(f"You do not have permissions to write to '{self.filepath}'.")
        except OSError as e:
            raise OSError(f"Unexpected error writing to file '{self.filepath}': '{e}'.")

    def writeLines(self, lines: list[str]) -> bool:
        """
        Writes one record per line, each terminated by `newline`.

        Args:
            lines (list[str]): Records without terminators.

        Returns:
            bool: True if the write operation was successful.
        """
        return self.writeFile(''.join(line + self.newline for line in lines))
