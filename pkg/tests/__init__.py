# Tests package for vpquad
