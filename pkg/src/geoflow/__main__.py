from geoflow.cli import main
import sys

sys.exit(main())
