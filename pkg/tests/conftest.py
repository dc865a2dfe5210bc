from hypothesis import settings

# deterministic example generation keeps the suite reproducible run to run
settings.register_profile("deterministic", derandomize=True, max_examples=60)
settings.load_profile("deterministic")
