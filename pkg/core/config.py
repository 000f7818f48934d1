"""
Runtime configuration.

Values come from the environment (optionally a .env file in the working
directory). Everything here is a module-level constant, read once at import.
"""
import os

from dotenv import load_dotenv

load_dotenv()

# ── Numerics ─────────────────────────────────────────────────────────────────
HERMITE_K_CAP       = int(os.getenv("SQUEEZELAB_HERMITE_K_CAP", "512"))
SERIES_TOL          = float(os.getenv("SQUEEZELAB_SERIES_TOL", "1e-12"))
SERIES_TERM_CAP     = int(os.getenv("SQUEEZELAB_SERIES_TERM_CAP", "2000000"))
QUAD_POINTS         = int(os.getenv("SQUEEZELAB_QUAD_POINTS", "200"))
QUAD_WIDTH_FACTOR   = float(os.getenv("SQUEEZELAB_QUAD_WIDTH_FACTOR", "6.0"))
ORACLE_MAX_STEP     = float(os.getenv("SQUEEZELAB_ORACLE_MAX_STEP", "0.1"))  # node spacing for partial-trace oracle

# ── Kinematics ───────────────────────────────────────────────────────────────
PROTON_MASS_GEV     = float(os.getenv("SQUEEZELAB_PROTON_MASS_GEV", "0.938"))
REFERENCE_RATIO     = 1e-6  # quoted interaction-time ratio for a 900 GeV proton

# ── Rapidity limits ──────────────────────────────────────────────────────────
MAX_SWEEP_ETA       = 700.0  # ln coth(η/2) underflows near 745
MAX_BOOST_ETA       = 350.0  # e^{2η} overflows near 355

# ── Runtime ──────────────────────────────────────────────────────────────────
WORKERS             = int(os.getenv("SQUEEZELAB_WORKERS", "1"))
LOG_LEVEL           = os.getenv("SQUEEZELAB_LOG_LEVEL", "WARNING").upper()
