def outer():
    state = []

    def inner(x):
        def innermost(y):
            return y + 1
        state.append(innermost(x))
        return state

    return inner
