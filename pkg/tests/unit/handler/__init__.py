"""Tests para el módulo handler"""
