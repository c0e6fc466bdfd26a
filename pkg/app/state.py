from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from concurrent.futures import ThreadPoolExecutor

# None runs every kernel job inline on the calling thread
executor: "ThreadPoolExecutor | None" = None
