"""Test suite for byzgossip."""
