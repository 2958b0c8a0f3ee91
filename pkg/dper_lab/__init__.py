# -*- coding: utf-8 -*-
from __future__ import absolute_import, print_function, unicode_literals


__author__ = "DPER Lab Developers"
__email__ = "dper-lab@users.noreply.github.com"
__version__ = "0.1.0"
