"""JSON persistence for instances, worlds and plans."""
