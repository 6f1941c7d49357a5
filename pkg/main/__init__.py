# Network steering package
