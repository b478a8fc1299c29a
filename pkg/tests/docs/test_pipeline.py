from docs_src.pipeline import main


def test_pipeline_example():
    main()
