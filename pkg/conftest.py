import os
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent / "relspace"))
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "relspace.settings")

import django

django.setup()
