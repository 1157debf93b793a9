# liouville-lab package
