"""Physical constants used throughout the package."""

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact by SI definition

TORR_TO_PA = 101_325.0 / 760.0  # fixed conversion, 1 Torr in Pa
