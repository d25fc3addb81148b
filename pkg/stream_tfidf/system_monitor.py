#!/usr/bin/env python3
"""
System Monitor for benchmark runs
Describes the host the timings were taken on
"""

import logging
import platform
import sys
from typing import Any, Dict, Optional

import psutil

logger = logging.getLogger(__name__)


class SystemMonitor:
    """Collects host facts written next to the benchmark tables"""

    def get_cpu_info(self) -> Dict[str, Any]:
        """
        CPU counts and nominal frequency

        Returns:
            Dictionary with logical/physical core counts and frequency in MHz
        """
        freq_mhz: Optional[float] = None
        try:
            freq = psutil.cpu_freq()
            if freq is not None:
                freq_mhz = round(freq.max or freq.current, 1)
        except Exception as e:
            logger.debug(f"Could not read CPU frequency: {e}")

        return {
            'cpu_logical': psutil.cpu_count(logical=True),
            'cpu_physical': psutil.cpu_count(logical=False),
            'cpu_freq_mhz': freq_mhz,
            'processor': platform.processor() or platform.machine(),
        }

    def get_ram_info(self) -> Dict[str, float]:
        try:
            mem = psutil.virtual_memory()
            return {
                'ram_total_mb': round(mem.total / (1024 * 1024), 1),
                'ram_available_mb': round(mem.available / (1024 * 1024), 1),
            }
        except Exception as e:
            logger.error(f"Error getting RAM info: {e}")
            return {'ram_total_mb': 0, 'ram_available_mb': 0}

    def get_all_stats(self) -> Dict[str, Any]:
        """Everything in one flat dictionary"""
        stats = {
            'platform': platform.platform(),
            'python': sys.version.split()[0],
        }
        stats.update(self.get_cpu_info())
        stats.update(self.get_ram_info())
        return stats
