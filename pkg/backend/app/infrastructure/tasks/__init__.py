from app.infrastructure.tasks.pool import ordered_map

__all__ = ["ordered_map"]
