def load_tests(loader, tests, ignore):
    import doctest
    from .. import (ast, classify, config, descriptor_grammar, directed, first, grammar, lrparser, oracle,
        ordered, ppcalc, rule, szmielew, valued)
    from . import (test_classify, test_cli, test_directed, test_oracle, test_ordered, test_parser,
        test_ppcalc, test_szmielew, test_valued)

    tests.addTests(doctest.DocTestSuite(ast))
    tests.addTests(doctest.DocTestSuite(classify))
    tests.addTests(doctest.DocTestSuite(config))
    tests.addTests(doctest.DocTestSuite(descriptor_grammar))
    tests.addTests(doctest.DocTestSuite(directed))
    tests.addTests(doctest.DocTestSuite(first))
    tests.addTests(doctest.DocTestSuite(grammar))
    tests.addTests(doctest.DocTestSuite(lrparser))
    tests.addTests(doctest.DocTestSuite(oracle))
    tests.addTests(doctest.DocTestSuite(ordered))
    tests.addTests(doctest.DocTestSuite(ppcalc))
    tests.addTests(doctest.DocTestSuite(rule))
    tests.addTests(doctest.DocTestSuite(szmielew))
    tests.addTests(doctest.DocTestSuite(valued))

    for mod in (test_classify, test_cli, test_directed, test_oracle, test_ordered, test_parser,
            test_ppcalc, test_szmielew, test_valued):
        tests.addTests(loader.loadTestsFromModule(mod))
    return tests

if __name__ == '__main__':
    import unittest
    unittest.main()
