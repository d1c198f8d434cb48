"""Tests for shallowscope."""
