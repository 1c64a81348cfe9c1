"""Shared utilities for the services and the command line"""
