"""Test Package

Contains unit and integration tests for the PAM laboratory.
"""
