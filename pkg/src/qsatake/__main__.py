from qsatake.cli import main

main()
