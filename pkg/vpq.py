from vpquad.cli import main

if __name__ == "__main__":
    # e.g. python vpq.py run --scenario flip --plot
    main()
