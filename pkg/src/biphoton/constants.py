"""Physical constants in the package's working units (nm, fs, rad/fs)."""

SPEED_OF_LIGHT_NM_PER_FS = 299.792458
