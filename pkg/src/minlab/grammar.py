class Grammar:
    """An ordered set of production rules.

    The first rule's left side is the start symbol.

    >>> from .rule import Rule
    >>> g = Grammar(
    ...     Rule('desc', ('items',)),
    ...     Rule('items', ('item',)),
    ...     Rule('items', ('items', '(+)', 'item')))
    >>> print(g)
    'desc' = 'items';
    'items' = 'item';
    'items' = 'items', '(+)', 'item';
    >>> len(g), g[0]
    (3, Rule('desc', ('items',)))

    Symbols standing on the left of some rule are non-terminals,
    everything else is a terminal.

    >>> [g.is_terminal(symbol) for symbol in ('desc', 'items', 'item', '(+)')]
    [False, False, True, True]
    >>> sorted(g.nonterms())
    ['desc', 'items']
    >>> sorted(g.terminals())
    ['(+)', 'item']
    >>> for rule in g.rules('items'): print(rule)
    'items' = 'item';
    'items' = 'items', '(+)', 'item';
    >>> g.rules('item')
    ()
    """

    def __init__(self, *rules, symbols=()):
        self._rules = rules
        self._nonterms = frozenset(rule.left for rule in rules)

        all_symbols = list(symbols)
        for rule in rules:
            all_symbols.append(rule.left)
            all_symbols.extend(rule.right)
        self._symbols = frozenset(all_symbols)

        self._rule_cache = {}
        for rule in rules:
            self._rule_cache.setdefault(rule.left, []).append(rule)
        self._rule_cache = {left: tuple(rules) for left, rules in self._rule_cache.items()}

    def __getitem__(self, index):
        return self._rules[index]

    def __len__(self):
        return len(self._rules)

    def __iter__(self):
        return iter(self._rules)

    def __str__(self):
        return '\n'.join(str(rule) for rule in self._rules)

    def __repr__(self):
        """
        >>> from .rule import Rule
        >>> print(repr(Grammar(Rule('mult', ('INT',)), Rule('mult', ('w',)))))
        Grammar(Rule('mult', ('INT',)), Rule('mult', ('w',)))
        """
        return 'Grammar(%s)' % ', '.join(repr(rule) for rule in self._rules)

    def rules(self, left):
        """Returns the rules with `left` on the left side."""
        return self._rule_cache.get(left, ())

    def is_terminal(self, symbol):
        return symbol not in self._nonterms

    def nonterms(self):
        return self._nonterms

    def symbols(self):
        return self._symbols

    def terminals(self):
        return self._symbols - self._nonterms
