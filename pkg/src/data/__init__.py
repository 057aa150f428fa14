"""Data module for the application: price files, reports and plot files."""
