from hypothesis import HealthCheck, settings

import structural

settings.register_profile("default", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# must run before test modules import the builders
structural.install()
