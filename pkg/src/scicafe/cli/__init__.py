"""Command-line front door: admin client, simulation runner, server launcher."""
