# Tests unitaires et de propriétés de ccball
