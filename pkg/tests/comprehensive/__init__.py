"""Acceptance-scale tests for full system validation"""
