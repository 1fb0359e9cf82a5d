"""
Performance Monitor
Tracks per-stage wall time and resource usage of pipeline runs
"""

import json
import time
import threading
from collections import deque
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List

import psutil

from utils.logger import get_logger


class PerformanceMonitor:
    """Monitors stage timings and process memory for pipeline runs"""

    def __init__(self, config: Dict[str, Any]):
        self.config = config
        self.logger = get_logger('performance_monitor')

        # Configuration
        self.enabled = config.get('enabled', True)
        self.metrics_file = config.get('metrics_file', 'logs/metrics.json')
        self.max_stage_seconds = config.get('max_stage_seconds', 3600.0)
        self.max_memory_usage = config.get('max_memory_usage', 80.0)  # percent

        # Metrics storage
        self.stage_history = deque(maxlen=1000)  # Keep last 1000 stage records
        self.system_stats = deque(maxlen=100)
        self._local = threading.local()  # per-thread stage timings of the current run

        self.total_stages = 0
        self.startup_time = time.time()
        self._lock = threading.Lock()
        self._process = psutil.Process()

        if not self.enabled:
            self.logger.info("Performance monitoring disabled")
        else:
            Path(self.metrics_file).parent.mkdir(parents=True, exist_ok=True)
            self.logger.debug("Performance monitor initialized")

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """Time a pipeline stage: ``with monitor.stage('solve'): ...``"""
        start = time.perf_counter()
        rss_before = self._rss_mb()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.record_stage(name, elapsed, self._rss_mb() - rss_before)

    def record_stage(self, name: str, seconds: float, rss_delta_mb: float = 0.0) -> None:
        """Record one stage timing"""
        with self._lock:
            run = self._current_run()
            run[name] = run.get(name, 0.0) + seconds
            if not self.enabled:
                return
            self.total_stages += 1
            self.stage_history.append({
                'timestamp': time.time(),
                'stage': name,
                'seconds': seconds,
                'rss_delta_mb': rss_delta_mb,
            })
        if seconds > self.max_stage_seconds:
            self.logger.warning(f"Slow stage '{name}': {seconds:.1f}s")

    def stage_times(self) -> Dict[str, float]:
        """Accumulated stage timings since the last reset_run"""
        with self._lock:
            return dict(self._current_run())

    def reset_run(self) -> None:
        with self._lock:
            self._local.run = {}

    def collect_system_stats(self) -> Dict[str, Any]:
        """Collect current system statistics"""
        if not self.enabled:
            return {}

        try:
            memory = psutil.virtual_memory()
            stats = {
                'timestamp': time.time(),
                'cpu_percent': psutil.cpu_percent(interval=None),
                'memory_percent': memory.percent,
                'memory_available_mb': memory.available / 1024 / 1024,
                'process_memory_mb': self._rss_mb(),
                'process_threads': self._process.num_threads(),
            }
            self.system_stats.append(stats)
            if memory.percent > self.max_memory_usage:
                self.logger.warning(f"High memory usage: {memory.percent:.1f}%")
            return stats

        except Exception as e:
            self.logger.error(f"Error collecting system stats: {e}")
            return {}

    def get_performance_summary(self) -> Dict[str, Any]:
        """Get current performance summary"""
        try:
            with self._lock:
                history = list(self.stage_history)

            per_stage: Dict[str, List[float]] = {}
            for record in history:
                per_stage.setdefault(record['stage'], []).append(record['seconds'])

            stage_stats = {
                name: {
                    'count': len(times),
                    'avg_seconds': sum(times) / len(times),
                    'max_seconds': max(times),
                    'total_seconds': sum(times),
                }
                for name, times in per_stage.items()
            }

            return {
                'uptime_seconds': time.time() - self.startup_time,
                'total_stages': self.total_stages,
                'stage_stats': stage_stats,
                'system_stats': self.system_stats[-1] if self.system_stats else {},
                'timestamp': time.time(),
            }

        except Exception as e:
            self.logger.error(f"Error generating performance summary: {e}")
            return {}

    def save_metrics(self) -> None:
        """Append the current summary to the metrics file"""
        if not self.enabled:
            return
        try:
            self.collect_system_stats()
            summary = self.get_performance_summary()

            metrics_data: List[Dict[str, Any]] = []
            path = Path(self.metrics_file)
            if path.exists():
                try:
                    with open(path, 'r') as f:
                        metrics_data = json.load(f)
                except (OSError, json.JSONDecodeError):
                    metrics_data = []

            metrics_data.append(summary)

            # Keep only recent metrics (last 1000 entries)
            if len(metrics_data) > 1000:
                metrics_data = metrics_data[-1000:]

            with open(path, 'w') as f:
                json.dump(metrics_data, f, indent=2)

        except Exception as e:
            self.logger.error(f"Error saving metrics: {e}")

    def _current_run(self) -> Dict[str, float]:
        if not hasattr(self._local, 'run'):
            self._local.run = {}
        return self._local.run

    def _rss_mb(self) -> float:
        try:
            return self._process.memory_info().rss / 1024 / 1024
        except psutil.Error:
            return 0.0
