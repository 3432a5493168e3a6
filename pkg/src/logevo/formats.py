"""Shipped line-format presets for the supported raw log layouts."""

from .records import LineFormat

# "2017-05-16 00:00:04 ERROR Connection timeout to host db-7"
SIMPLE = LineFormat(
    name="simple",
    pattern=r"(?P<timestamp>\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2}) (?P<level>\S+) (?P<text>.*)",
    timestamp_format="%Y-%m-%d %H:%M:%S",
)

# "2015-10-18 18:01:47,978 INFO [main] org.apache.hadoop...: message"
HDFS_2 = LineFormat(
    name="HDFS_2",
    pattern=(
        r"(?P<timestamp>\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2}),\d+\s+"
        r"(?P<level>\w+)\s+(?:\[(?P<source>[^\]]*)\]\s+)?(?P<text>.*)"
    ),
    timestamp_format="%Y-%m-%d %H:%M:%S",
)

# "Jun 14 15:16:01 combo sshd(pam_unix)[19939]: authentication failure"
# Syslog carries no year and no level token; level resolves to OTHER.
LINUX = LineFormat(
    name="Linux",
    pattern=(
        r"(?P<timestamp>[A-Z][a-z]{2}\s+\d{1,2} \d{2}:\d{2}:\d{2}) "
        r"(?P<source>\S+) (?:(?P<level>ERROR|WARN|WARNING|INFO|DEBUG|ERR|FATAL|TRACE): )?(?P<text>.*)"
    ),
    timestamp_format="%b %d %H:%M:%S",
    default_year=2017,
)

# "2015-07-29 17:41:41,648 - INFO  [main:QuorumPeer@913] - message"
ZOOKEEPER = LineFormat(
    name="Zookeeper",
    pattern=(
        r"(?P<timestamp>\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2}),\d+ - "
        r"(?P<level>\w+)\s+\[(?P<source>[^\]]*)\] - (?P<text>.*)"
    ),
    timestamp_format="%Y-%m-%d %H:%M:%S",
)

# "nova-api.log.1.2017-05-16_13:53:08 2017-05-16 00:00:00.008 25746 INFO
#  nova.osapi_compute.wsgi.server [req-...] message"
OPENSTACK = LineFormat(
    name="OpenStack",
    pattern=(
        r"(?:\S+ )?(?P<timestamp>\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2})\.\d+ \d+ "
        r"(?P<level>\w+) (?P<source>\S+) (?P<text>.*)"
    ),
    timestamp_format="%Y-%m-%d %H:%M:%S",
)

PRESETS = {
    fmt.name: fmt for fmt in (SIMPLE, HDFS_2, LINUX, ZOOKEEPER, OPENSTACK)
}
