import sys

from nlpot.cli import main

sys.exit(main())
