"""Integration tests for the command line"""
