# Problem model package
