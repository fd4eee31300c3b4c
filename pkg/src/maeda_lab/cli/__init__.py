"""Command-line subcommands and output encoders."""
