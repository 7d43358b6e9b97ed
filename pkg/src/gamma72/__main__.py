from gamma72.cli import main

main()
