namespace tiltlab {}
