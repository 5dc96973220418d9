"""Test package for the dense WLAN simulator."""
