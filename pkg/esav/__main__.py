import sys
from .esav_cli import esav_main

if __name__ == "__main__":
    sys.exit(esav_main())
