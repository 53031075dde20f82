from qcring.main import main

main()
