"""Utilities module"""
