def test_imports():
    import newtonscope
    from newtonscope import oracle, poly, polytope, tracker, tropical, witness
    from newtonscope.cli import main

    assert hasattr(newtonscope, "__version__")
    assert callable(main.main)
    for module in (oracle, poly, polytope, tracker, tropical, witness):
        assert module.__all__
