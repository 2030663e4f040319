"""
Tests para dynloss.

Estructura:
- unit/: Tests unitarios (redes pequeñas, sin ficheros grandes)
- integration/: CLI y reproducciones de los experimentos
- fixtures/: Datasets y parámetros de prueba
"""
