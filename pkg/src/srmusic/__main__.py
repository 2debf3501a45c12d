from srmusic.cli import entry

entry()
