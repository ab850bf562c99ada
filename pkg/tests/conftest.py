import pathlib
import sys

# make tests/helpers.py importable under any pytest import mode
sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))
