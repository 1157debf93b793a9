# Test package for liouville-lab
