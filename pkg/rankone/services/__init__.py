"""Domain services: kinematics, conversions, criteria, oracle and catalog."""
