import sys
from MeshFlow.cli import main

sys.exit(main())
