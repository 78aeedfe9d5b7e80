"""Environment configuration for xres."""
import os
from pathlib import Path

from dotenv import load_dotenv

# Load .env from project root (next to this file) so bounds apply regardless of cwd
load_dotenv(Path(__file__).resolve().parent / ".env")

MAXDIM = int(os.getenv("XRES_MAXDIM", "4"))
ENUM_BOUND = int(os.getenv("XRES_ENUM_BOUND", "500"))
LIFT_FACTORS = int(os.getenv("XRES_LIFT_FACTORS", "6"))
LIFT_WORD_LENGTH = int(os.getenv("XRES_LIFT_WORD_LENGTH", "24"))
AUT_LIMIT = int(os.getenv("XRES_AUT_LIMIT", "60"))
IDENTIFY_LIMIT = int(os.getenv("XRES_IDENTIFY_LIMIT", "500"))
LOG_LEVEL = os.getenv("XRES_LOG_LEVEL", "WARNING").upper()

# Coset enumeration may define many more cosets than the final group order
COSET_SLACK = int(os.getenv("XRES_COSET_SLACK", "64"))
