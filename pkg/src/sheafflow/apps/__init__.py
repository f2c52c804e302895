"""Application drivers: event-timing synchronization, shortest paths,
preference diffusion."""
