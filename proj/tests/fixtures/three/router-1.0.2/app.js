var FW_VERSION = '1.0.2';
