from rep_lab.cli.main import main

main()
