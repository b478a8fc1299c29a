from docs_src.modulus import main


def test_modulus_example():
    main()
