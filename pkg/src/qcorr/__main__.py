from qcorr.cli import main
import sys

sys.exit(main())
