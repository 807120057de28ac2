"""Case-study fixture: per-installation minutes and previously published
percentages for the five hydraulic-system installations."""

# (installation, training minutes, hands-on task minutes) with video training
BASELINE_TIMES = [
    ("Hydraulic Pump", 180.0, 30.0),
    ("Hydraulic Reservoir", 270.0, 60.0),
    ("High Pressure Filter", 180.0, 45.0),
    ("Anti-Skid Control Valve", 150.0, 45.0),
    ("Quick Disconnect Coupling Suction", 135.0, 30.0),
]

# the same installations trained with the interactive-3D courseware
INTERACTIVE_TIMES = [
    ("Hydraulic Pump", 120.0, 20.0),
    ("Hydraulic Reservoir", 180.0, 45.0),
    ("High Pressure Filter", 90.0, 30.0),
    ("Anti-Skid Control Valve", 90.0, 30.0),
    ("Quick Disconnect Coupling Suction", 90.0, 20.0),
]

# percentages as previously published (two cells disagree with the arithmetic)
PUBLISHED_PCT = {
    "Hydraulic Pump": (33.3, 34.0),
    "Hydraulic Reservoir": (33.3, 25.0),
    "High Pressure Filter": (50.0, 33.3),
    "Anti-Skid Control Valve": (40.0, 33.3),
    "Quick Disconnect Coupling Suction": (50.0, 34.0),
}

EXPECTED_TRAINING_SAVED = [33.3, 33.3, 50.0, 40.0, 33.3]
EXPECTED_TASK_SAVED = [33.3, 25.0, 33.3, 33.3, 33.3]
