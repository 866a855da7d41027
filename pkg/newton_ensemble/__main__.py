import sys

from newton_ensemble.cli import main

if __name__ == '__main__':
    sys.exit(main())
