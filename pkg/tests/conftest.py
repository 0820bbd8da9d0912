import pytest

from pwr.netlist import parse_characterization, parse_design

# Three-island sample SoC: cpu core and memory retargeted to 0.8 V, the USB
# hard core pinned at 1.2 V.  The only under-driven crossing is cpu -> usb.
THREE_ISLAND_INTENT = """\
island cpu vdd=0.8 switchable=0 retention=0
island mem vdd=0.8 switchable=0 retention=0
island usb vdd=1.2 switchable=0 retention=0
"""

THREE_ISLAND_NETLIST = """\
cell cpu0 kind=std island=cpu cap_ff=1200.0 gates=30000
cell mem0 kind=sram island=mem cap_ff=800.0 gates=50000
cell usb0 kind=std island=usb cap_ff=400.0 gates=9000
net cpu2usb driver=cpu0.z loads=usb0.a
net cpu2mem driver=cpu0.y loads=mem0.a
net mem2cpu driver=mem0.q loads=cpu0.a
net usb2cpu driver=usb0.z loads=cpu0.b
"""

# Gated sample SoC: a switchable 108k-gate logic island at 1.2 V next to an
# always-on cpu island (which hosts the island manager) and a 0.8 V memory.
GATED_INTENT = """\
island cpu vdd=1.2 switchable=0 retention=0
island mem vdd=0.8 switchable=0 retention=0
island logic vdd=1.2 switchable=1 retention=1
"""

GATED_NETLIST = """\
cell cpu0 kind=std island=cpu cap_ff=900.0 gates=20000
cell pim0 kind=pim island=cpu cap_ff=50.0 gates=1
cell mem0 kind=sram island=mem cap_ff=700.0 gates=40000
cell logic0 kind=std island=logic cap_ff=300.0 gates=21600
cell logic1 kind=std island=logic cap_ff=300.0 gates=21600
cell logic2 kind=std island=logic cap_ff=300.0 gates=21600
cell logic3 kind=std island=logic cap_ff=300.0 gates=21600
cell logic4 kind=std island=logic cap_ff=300.0 gates=21600
net l2c driver=logic0.z loads=cpu0.a
net l2m driver=logic1.z loads=mem0.a
net m2c driver=mem0.q loads=cpu0.b
net m2l driver=mem0.q2 loads=logic2.a
net c2l driver=cpu0.z loads=logic3.a
net l_int driver=logic3.z loads=logic4.a
"""

# Post-route operating points for the cpu-class island: the slower libraries
# cost area and switched capacitance.  cap_factor values are calibrated from
# the measured dynamic-power outcomes at each voltage.
CHAR_TEXT = """\
op cpu vdd=1.2 fmax_mhz=155 area_um2=141429 cap_factor=1.0
op cpu vdd=1.0 fmax_mhz=155 area_um2=165424 cap_factor=1.1952
op cpu vdd=0.8 fmax_mhz=151 area_um2=183551 cap_factor=1.0575
op mem vdd=1.2 fmax_mhz=181 area_um2=300000 cap_factor=1.0
op mem vdd=0.8 fmax_mhz=181 area_um2=300000 cap_factor=1.0
"""

ACTIVITY_TEXT = """\
net cpu2usb toggles=30 duration_ns=1000
net cpu2mem toggles=120 duration_ns=1000
net mem2cpu toggles=60 duration_ns=1000
net usb2cpu toggles=15 duration_ns=1000
"""


@pytest.fixture
def soc3():
    return parse_design(THREE_ISLAND_NETLIST, THREE_ISLAND_INTENT)


@pytest.fixture
def gated_soc():
    return parse_design(GATED_NETLIST, GATED_INTENT)


@pytest.fixture
def char_table():
    return parse_characterization(CHAR_TEXT)
