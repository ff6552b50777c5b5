#!/usr/bin/python3

from .main import main

exit(main())
