import os
import sys

# Add modules to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from modules.cli import skewhh

if __name__ == "__main__":
    skewhh(prog_name="skewhh")
