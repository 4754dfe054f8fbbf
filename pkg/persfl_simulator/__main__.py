import sys

from persfl_simulator.main import main

if __name__ == "__main__":
    sys.exit(main())
