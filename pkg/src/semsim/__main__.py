from semsim.cli import main
import sys

sys.exit(main())
