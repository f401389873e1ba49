# pbif_homology/__init__.py
# P-bifurcation detection with superlevel persistent homology.
from .config import VERSION as __version__
