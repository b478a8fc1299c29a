from docs_src.circle_packing import main


def test_circle_packing_example():
    main()
