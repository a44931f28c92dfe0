import sys

from qdual.cli import main

if __name__ == "__main__":
	# same as the installed `qdual` script, e.g. `python run.py verify all`
	sys.exit(main())
