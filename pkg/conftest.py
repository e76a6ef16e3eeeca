# conftest.py
import os
import sys

# Modules under src/ import each other by bare name
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src'))
