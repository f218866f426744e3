class Rule:
    """A single production of the descriptor grammar.

    A rule has one non-terminal on the left and a (possibly empty)
    tuple of symbols on the right. The sum of summands in a descriptor
    is written as a left-recursive list.

    >>> r = Rule('items', ('items', '(+)', 'item'))
    >>> print(r)
    'items' = 'items', '(+)', 'item';

    Symbols only have to be hashable.

    >>> print(Rule(0, (1, 2)))
    0 = 1, 2;

    A one-symbol right side still needs a tuple.

    >>> print(Rule('desc', ('items',)))
    'desc' = 'items';

    An empty right side produces the empty word.

    >>> print(Rule('e', ()))
    'e' = ;

    >>> r.left, r.right
    ('items', ('items', '(+)', 'item'))

    The semantic action is opaque to the rule; the parser calls it
    with the context followed by the values of the right-side symbols.

    >>> repr(r.action)
    'None'
    >>> def add_item(ctx, items, _op, item):
    ...     return items + [item]
    >>> r = Rule('items', ('items', '(+)', 'item'), action=add_item)
    >>> r.action(None, ['C(2,1)'], '(+)', 'Q')
    ['C(2,1)', 'Q']
    """

    def __init__(self, left, right=(), action=None):
        self.left = left
        self.right = tuple(right)
        self.action = action

    def __eq__(self, other):
        if not isinstance(other, Rule):
            return NotImplemented
        return (self.left, self.right, self.action) == (other.left, other.right, other.action)

    def __hash__(self):
        return hash((self.left, self.right, self.action))

    def __str__(self):
        """
        >>> print(Rule('mult', ('INT',)))
        'mult' = 'INT';
        >>> def _mult_omega(ctx, w): pass
        >>> print(Rule('mult', ('w',), _mult_omega))
        'mult' = 'w'; {_mult_omega}
        """
        r = [repr(self.left), ' = ', ', '.join(repr(symbol) for symbol in self.right), ';']
        if self.action is not None:
            r.extend((' {', getattr(self.action, '__name__', ''), '}'))
        return ''.join(r)

    def __repr__(self):
        """
        >>> print(repr(Rule('atom', ('Q',))))
        Rule('atom', ('Q',))
        >>> def _atom(ctx, tok): return tok
        >>> print(repr(Rule('atom', ('Q',), action=_atom))) # doctest: +ELLIPSIS
        Rule('atom', ('Q',), <function _atom...>)
        """
        if self.action is not None:
            args = (self.left, self.right, self.action)
        else:
            args = (self.left, self.right)
        return 'Rule(%s)' % ', '.join(repr(arg) for arg in args)
