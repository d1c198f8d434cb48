import sys

from shallowscope.cli.main import main

sys.exit(main())
