import pytest

import loopforge as lf


@pytest.fixture(scope="session")
def s3():
    return lf.s3()


@pytest.fixture(scope="session")
def c6():
    return lf.cyclic(6)


@pytest.fixture(scope="session")
def chein12():
    return lf.chein12()


@pytest.fixture(scope="session")
def cml81():
    return lf.cml81()


@pytest.fixture(scope="session")
def paige2():
    return lf.paige_loop(2)


@pytest.fixture(scope="session")
def paige2_x_c2(paige2):
    return lf.direct_product(paige2, lf.cyclic(2))


# alternative loop algebra bundles are the expensive objects; build each once
@pytest.fixture(scope="session")
def cml81_gf3(cml81):
    return lf.alternative_loop_algebra(lf.PrimeField(3), cml81)


@pytest.fixture(scope="session")
def cml81_gf5(cml81):
    return lf.alternative_loop_algebra(lf.PrimeField(5), cml81)


@pytest.fixture(scope="session")
def cml81_gf7(cml81):
    return lf.alternative_loop_algebra(lf.PrimeField(7), cml81)


@pytest.fixture(scope="session")
def chein12_gf7(chein12):
    return lf.alternative_loop_algebra(lf.PrimeField(7), chein12)


@pytest.fixture(scope="session")
def paige2_gf11(paige2):
    return lf.alternative_loop_algebra(lf.PrimeField(11), paige2)
