# -*- coding: utf-8 -*-
# Bare ``settings.py`` for validating experiment configuration with Django forms
SECRET_KEY = "dper-lab"

INSTALLED_APPS = ()

USE_I18N = False
USE_TZ = False
