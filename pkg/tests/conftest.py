import hypothesis

hypothesis.settings.register_profile(
    "rclab", deadline=None, max_examples=30, derandomize=True
)
hypothesis.settings.load_profile("rclab")
