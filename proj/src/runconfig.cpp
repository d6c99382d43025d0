namespace fda {}
